#include "cli.hpp"

int main(int argc, char** argv) { return hts::cli_main(argc, argv); }
