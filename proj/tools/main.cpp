#include "wigner_align/cli.hpp"

int main(int argc, char** argv) { return wigner_align::cli_main(argc, argv); }
