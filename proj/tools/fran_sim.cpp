#include <fran/cli.hpp>

int main(int argc, char** argv)
{
    return fran::cli_main(argc, argv);
}
