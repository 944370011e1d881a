#include "fuzzpipe/sim/ground_truth.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"

namespace fuzzpipe::sim {

void save_ground_truth(const std::vector<TruthRecord>& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ground truth: " + path);
    out << "frame,object_id,parent_id,predecessor_id,x,y,z,radius\n";
    for (const auto& r : truth) {
        out << r.frame << "," << r.object_id << "," << r.parent_id << "," << r.predecessor_id
            << "," << core::format_real(r.position.x) << "," << core::format_real(r.position.y)
            << "," << core::format_real(r.position.z) << "," << core::format_real(r.radius)
            << "\n";
    }
}

std::vector<TruthRecord> load_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ground truth: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty ground truth: " + path);
    std::vector<TruthRecord> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string tok;
        TruthRecord r;
        std::getline(ss, tok, ',');
        r.frame = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.object_id = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.parent_id = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.predecessor_id = std::stoi(tok);
        std::getline(ss, tok, ',');
        r.position.x = core::parse_real(tok);
        std::getline(ss, tok, ',');
        r.position.y = core::parse_real(tok);
        std::getline(ss, tok, ',');
        r.position.z = core::parse_real(tok);
        std::getline(ss, tok, ',');
        r.radius = core::parse_real(tok);
        out.push_back(r);
    }
    return out;
}

}  // namespace fuzzpipe::sim
