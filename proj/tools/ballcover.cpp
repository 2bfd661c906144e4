#include "ballcover/cli.hpp"

int main(int argc, char** argv) { return ballcover::cli::run(argc, argv); }
