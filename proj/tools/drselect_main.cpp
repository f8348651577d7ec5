#include "drselect/cli/commands.hpp"

int main(int argc, char** argv) { return drselect::cli::run(argc, argv); }
