#include "purpose/cli.h"

int main(int argc, char** argv) { return purpose::cli::run(argc, argv); }
