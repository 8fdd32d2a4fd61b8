#include "exrmt/cli.hpp"

int main(int argc, char** argv) { return exrmt::run_cli(argc, argv); }
