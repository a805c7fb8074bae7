#include "dbcsp/cli.hpp"

int main(int argc, char** argv) { return dbcsp::cli::run(argc, argv); }
