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


// Detects the twist group of a planted system and prints per-prime verdicts.
// usage: detect_and_classify [eigensystem.json]   (defaults to data/vantop.json)

#include <iostream>

#include "twist/image.hpp"

int main(int argc, char** argv) {
    using namespace twist;
    const std::string path = argc > 1 ? argv[1] : TWIST_DATA_DIR "/vantop.json";
    try {
        EigenSystem s = normalize(load_system(io::read_json(path)));
        DetectionOptions o;
        auto a = analyze_twists(s, o);
        std::cout << "|Gamma| = " << a.group.full_subgroup.size() << ", |Gamma_inn| = " << a.group.inner_subgroup.size()
                  << ", F_inn = Q[x]/(" << a.fields.F_inn.min_poly.str() << ")\n";
        auto report = image_report(s, a.group, primes_up_to(60), o);
        for (const auto& pv : report.primes)
            for (const auto& w : pv.places) std::cout << pv.p << "\t" << w.group_label << "\n";
        std::cout << "predicted dimension " << report.predicted_dimension << "\n";
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
