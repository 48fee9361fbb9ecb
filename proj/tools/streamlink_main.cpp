#include "streamlink/app/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return streamlink::app::run(argc, argv, std::cout, std::cerr); }
