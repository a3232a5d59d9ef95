#include <iostream>
#include <string>
#include <vector>

#include <frobcurves/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return frobcurves::run_cli(args, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
