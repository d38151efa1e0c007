#include "eragent/embedder.hpp"

#include <cmath>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

std::vector<double> LexicalEmbedder::embed(const std::string& text) const {
    std::vector<double> v(dim_, 0.0);
    for (const auto& term : util::tokenize(text)) {
        v[util::fnv1a64(term) % dim_] += 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double similarity(const std::string& a, const std::string& b, const Embedder& embedder) {
    if (util::trim(a).empty() || util::trim(b).empty()) {
        throw InvalidText("similarity requires non-empty texts");
    }
    return dot(embedder.embed(a), embedder.embed(b));
}

}  // namespace eragent
