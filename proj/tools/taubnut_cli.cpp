#include "taubnut/cli.hpp"

int main(int argc, char** argv) { return taubnut::cli::run(argc, argv); }
