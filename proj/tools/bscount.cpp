#include "bscount/cli/run.hpp"

int main(int argc, char** argv) { return bscount::cli::main_entry(argc, argv); }
