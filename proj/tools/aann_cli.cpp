#include "aann/pipeline.hpp"

int main(int argc, char** argv) { return aann::pipeline::run(argc, argv); }
