#include "volwin/cli.hpp"

int main(int argc, char** argv) { return volwin::cli::run(argc, argv); }
