#include "eof/cli.hpp"

int main(int argc, char** argv) { return eof::run_cli(argc, argv); }
