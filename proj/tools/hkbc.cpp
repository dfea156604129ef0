#include <hkbc/cli.hpp>

int main(int argc, char** argv) { return hkbc::run(argc, argv); }
