#include "eragent/cli.hpp"

int main(int argc, char** argv) { return eragent::run_cli(argc, argv); }
