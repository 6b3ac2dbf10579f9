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


// Compares detected inner twists with the recorded ones for a cached newform.
// usage: lmfdb_compare <label> [cache-dir]

#include <iostream>

#include "twist/lmfdb.hpp"

int main(int argc, char** argv) {
    using namespace twist;
    if (argc < 2) {
        std::cerr << "usage: lmfdb_compare <label> [cache-dir]\n";
        return 2;
    }
    lmfdb::ClientOptions opt;
    opt.cache_dir = argc > 2 ? argv[2] : TWIST_DATA_DIR "/lmfdb-cache";
    try {
        lmfdb::Client client(opt);
        auto rec = client.fetch_newform(argv[1]);
        auto sys = lmfdb::to_eigensystem(rec, std::vector<FieldElement>{});
        auto cmp = lmfdb::compare_inner_twists(sys, rec, 500);
        std::cout << io::to_json(cmp).dump(2) << "\n";
        return cmp.agree() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
