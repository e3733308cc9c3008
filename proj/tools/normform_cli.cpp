#include "normform/cli.hpp"

int main(int argc, char** argv) { return normform::cli::run(argc, argv); }
