// qrabi_main.cpp: CLI entry point.
#include <iostream>
#include <string>
#include <vector>

#include <qrabi/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qrabi::cli::run(std::move(args), std::cout, std::cerr);
}
