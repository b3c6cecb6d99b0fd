#include "qoslrd/cli.hpp"

int main(int argc, char** argv) { return qoslrd::cli::run(argc, argv); }
