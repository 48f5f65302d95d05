#include "uavmac/cli.hpp"

int main(int argc, char** argv) { return uavmac::cli::run(argc, argv); }
