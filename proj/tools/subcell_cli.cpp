#include <iostream>

#include "subcell/subcell.hpp"

int main() {
    std::cout << "subcell CLI placeholder\n";
    return 0;
}
