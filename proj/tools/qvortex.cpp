#include "qvortex/cli.hpp"

int main(int argc, char** argv) { return qvortex::cli::run(argc, argv); }
