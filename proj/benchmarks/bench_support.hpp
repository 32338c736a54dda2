#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "qcog/ingest.hpp"

namespace qcog_bench {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus_csv() {
    return read_file(std::string(QCOG_DATA_DIR) + "/hampton_fruits_vegetables.csv");
}

inline std::string spec_json() {
    return read_file(std::string(QCOG_DATA_DIR) + "/table2_wavefield.json");
}

inline qcog::ingest::ConceptPairData load_corpus() {
    return qcog::ingest::parse_probability_table(corpus_csv(), qcog::ingest::Format::Csv);
}

}  // namespace qcog_bench
