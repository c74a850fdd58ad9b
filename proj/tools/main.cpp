#include "cli.hpp"

int main(int argc, char** argv) { return twotier::cli::run(argc, argv); }
