#include "app.hpp"

int main(int argc, char** argv) { return jcpme::tools::run(argc, argv); }
