#include "eigencoprime/cli.hpp"

int main(int argc, char** argv) { return eigencoprime::cli::dispatch(argc, argv); }
