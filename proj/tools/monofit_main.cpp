#include "monofit/experiment.hpp"

int main(int argc, char** argv) { return monofit::cli_main(argc, argv); }
