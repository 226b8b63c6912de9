#include "nfb/cli_app.hpp"

int main(int argc, char** argv) { return nfb::run_cli(argc, argv); }
