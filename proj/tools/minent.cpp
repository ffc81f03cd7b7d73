#include <minent/cli.hpp>

int main(int argc, char** argv) { return minent::run(argc, argv); }
