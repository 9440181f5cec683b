#include "geoeval/cli.hpp"

int main(int argc, char** argv) { return geoeval::run_cli(argc, argv); }
