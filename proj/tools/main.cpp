#include "circlenf/cli.hpp"

int main(int argc, char** argv) { return circlenf::cli_main(argc, argv); }
