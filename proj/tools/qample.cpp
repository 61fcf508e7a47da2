#include "qample/cli.hpp"

int main(int argc, char** argv) { return qample::run_command(argc, argv, std::cout, std::cerr); }
