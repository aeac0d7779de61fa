#include <graphmatch/instance.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <vector>

namespace gm {

void GraphMatchingInstance::validate() const {
    require_square(A, "GraphMatchingInstance.A");
    require_square(B, "GraphMatchingInstance.B");
    require_same_order(A, B, "GraphMatchingInstance");
    if (!all_finite(A) || !all_finite(B)) throw std::invalid_argument("GraphMatchingInstance: non-finite entries");
    if (ground_truth && ground_truth->size() != order())
        throw std::invalid_argument("GraphMatchingInstance: ground_truth length " + std::to_string(ground_truth->size()) +
                                    " does not match order " + std::to_string(order()));
    if (noise_scale && !(*noise_scale >= 0.0)) throw std::invalid_argument("GraphMatchingInstance: negative noise_scale");
}

bool operator==(const GraphMatchingInstance& a, const GraphMatchingInstance& b) {
    return a.A == b.A && a.B == b.B && a.ground_truth == b.ground_truth && a.seed == b.seed &&
           a.noise_scale == b.noise_scale;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& M) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) arr.push_back(M(i, j));
    return arr;
}

Matrix matrix_from_json(const json& arr, int n, const char* name) {
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::invalid_argument(std::string("instance: field ") + name + " must hold n*n numbers");
    Matrix M(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = arr[k++].get<double>();
    return M;
}

}  // namespace

std::string serialize_instance(const GraphMatchingInstance& inst) {
    inst.validate();
    json j;
    j["n"] = inst.order();
    j["A"] = matrix_to_json(inst.A);
    j["B"] = matrix_to_json(inst.B);
    j["ground_truth"] = inst.ground_truth ? json(inst.ground_truth->map()) : json(nullptr);
    j["seed"] = inst.seed ? json(*inst.seed) : json(nullptr);
    j["noise_scale"] = inst.noise_scale ? json(*inst.noise_scale) : json(nullptr);
    return j.dump();
}

GraphMatchingInstance deserialize_instance(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    try {
        if (!j.is_object() || !j.contains("n") || !j.contains("A") || !j.contains("B"))
            throw std::invalid_argument("instance: missing required fields n, A, B");
        const int n = j.at("n").get<int>();
        if (n < 1) throw std::invalid_argument("instance: n must be >= 1");
        GraphMatchingInstance inst;
        inst.A = matrix_from_json(j.at("A"), n, "A");
        inst.B = matrix_from_json(j.at("B"), n, "B");
        if (j.contains("ground_truth") && !j.at("ground_truth").is_null())
            inst.ground_truth = Permutation(j.at("ground_truth").get<std::vector<int>>());
        if (j.contains("seed") && !j.at("seed").is_null()) inst.seed = j.at("seed").get<std::int64_t>();
        if (j.contains("noise_scale") && !j.at("noise_scale").is_null())
            inst.noise_scale = j.at("noise_scale").get<double>();
        inst.validate();
        return inst;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("instance: ") + e.what());
    }
}

void save_instance(const GraphMatchingInstance& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << serialize_instance(inst) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

GraphMatchingInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_instance(buf.str());
}

}  // namespace gm
