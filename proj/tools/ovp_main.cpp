#include "ovp/cli.hpp"

int main(int argc, char** argv) { return ovp::run_cli(argc, argv); }
