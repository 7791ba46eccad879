#include "placement/cli.hpp"

int main(int argc, char** argv) { return placement::cli::dispatch(argc, argv); }
