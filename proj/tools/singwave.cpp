#include "singwave/cli.hpp"

int main(int argc, char** argv) { return singwave::cli::run(argc, argv); }
