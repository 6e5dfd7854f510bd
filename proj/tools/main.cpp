#include <string>
#include <vector>

#include "slskit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return slskit::cli::run_cli(args);
}
