#include "cvwit/commands.hpp"

int main(int argc, char** argv) { return cvwit::cli::run(argc, argv); }
