#include "le2e/cli.hpp"

int main(int argc, char** argv) { return le2e::cli::run(argc, argv); }
