#include "sweep.hpp"

int main(int argc, char** argv) { return xythermo::cli::run(argc, argv); }
