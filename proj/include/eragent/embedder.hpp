#pragma once

#include <memory>
#include <string>
#include <vector>

namespace eragent {

/// Text embedding contract: deterministic, unit-normalized vectors.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) const = 0;
    virtual std::size_t dimension() const = 0;
};

/// Deterministic lexical embedder: lowercase, split on non-alphanumerics,
/// term-count vector over a hashed vocabulary, L2-normalized.
class LexicalEmbedder : public Embedder {
public:
    explicit LexicalEmbedder(std::size_t dim = 4096) : dim_(dim) {}
    std::vector<double> embed(const std::string& text) const override;
    std::size_t dimension() const override { return dim_; }

private:
    std::size_t dim_;
};

/// Cosine of two embeddings. Throws InvalidText on empty input.
double similarity(const std::string& a, const std::string& b, const Embedder& embedder);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace eragent
