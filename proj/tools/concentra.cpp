#include "concentra/cli.hpp"

int main(int argc, char** argv) { return concentra::cli::run(argc, argv); }
