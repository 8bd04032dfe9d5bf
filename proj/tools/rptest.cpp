#include "ratpoints/corpus.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return ratpoints::cli::run_corpus(args, std::cout, std::cerr);
}
