/*
   Copyright 2026 The twistctl Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


// Counts the fixed points of the twisted Frobenius action on SL_n(F_{q^2})
// for the trivial and the transpose-inverse cocycle.

#include <iostream>

#include "twist/cocycle.hpp"

int main() {
    using namespace twist;
    for (auto [n, q] : {std::pair{2, 2L}, {2, 3L}, {3, 2L}}) {
        auto M = FiniteModel::make(q, 2, n);
        auto split = twisted_fixed_points(M, trivial_cocycle(M)).order;
        auto unitary = twisted_fixed_points(M, flip_cocycle(M)).order;
        std::cout << "n=" << n << " q=" << q << "  SL: " << split << "  SU: " << unitary << "\n";
    }
}
