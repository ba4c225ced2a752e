#include "porocomb/cli.hpp"

int main(int argc, char** argv) { return porocomb::cli(argc, argv); }
