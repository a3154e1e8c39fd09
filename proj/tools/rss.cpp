#include "rss/cli.hpp"

int main(int argc, char** argv) { return rss::cli::run(argc, argv); }
