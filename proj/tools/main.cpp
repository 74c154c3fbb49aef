#include "commands.hpp"

int main(int argc, char** argv)
{
    return sgmh::cli::main_entry(argc, argv);
}
