#include <ocfrev/cli.hpp>

int main( int argc, char** argv )
{
    return ocfrev::cli::run( argc, argv );
}
