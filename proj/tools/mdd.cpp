#include "mdd/cli.hpp"

int main(int argc, char** argv) { return mdd::run_cli(argc, argv); }
