#include "gio/cli.hpp"

int main(int argc, char** argv) { return gio::cli::run(argc, argv); }
