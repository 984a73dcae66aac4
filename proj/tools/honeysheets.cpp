#include "honeysheets/cli.hpp"

int main(int argc, char** argv) {
    return honeysheets::cli::run(argc, argv);
}
