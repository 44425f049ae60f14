// Umbrella header.
#pragma once

#include "aann/ablation.hpp"
#include "aann/corpus.hpp"
#include "aann/detector.hpp"
#include "aann/ngram.hpp"
#include "aann/random.hpp"
#include "aann/scoring.hpp"
#include "aann/stimuli.hpp"
#include "aann/variant.hpp"
