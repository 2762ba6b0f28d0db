#include "commsum/cli.hpp"

int main(int argc, char** argv) { return commsum::cli::run(argc, argv); }
