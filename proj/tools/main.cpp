#include "gamelab/cli_driver.hpp"

int main(int argc, char** argv) {
    return gamelab::cli_main(argc, argv);
}
