#include "radmine/cli.h"

int main(int argc, char** argv) { return radmine::run_cli(argc, argv); }
