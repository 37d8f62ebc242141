#include "sfsdfc/cli.hpp"

int main(int argc, char** argv) { return sfsdfc::cli::run(argc, argv); }
