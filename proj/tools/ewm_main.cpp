#include <iostream>

#include "ewm/cli.hpp"

int main(int argc, char** argv)
{
    const auto parsed = ewm::cli::parse_args(argc, argv);
    std::cout << parsed.out_text;
    std::cerr << parsed.err_text;
    if (!parsed.invocation)
        return parsed.exit_code;
    return ewm::cli::execute(*parsed.invocation, std::cout, std::cerr);
}
