#include "cli.hpp"

int main(int argc, char** argv) { return bfl::cli::run_main(argc, argv); }
