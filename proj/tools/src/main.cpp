#include "hcd_cli/commands.hpp"

int main(int argc, char** argv) { return hcd::cli::run(argc, argv); }
