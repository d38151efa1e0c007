#include <doctest.h>

#include <filesystem>

#include "eragent/util.hpp"

using namespace eragent;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(util::tokenize("Hello, World-2024!") == std::vector<std::string>{"hello", "world", "2024"});
    CHECK(util::tokenize("").empty());
    CHECK(util::tokenize("...").empty());
}

TEST_CASE("normalize_text collapses case, punctuation, whitespace") {
    CHECK(util::normalize_text("  The  Quick, Brown.Fox ") == "the quick brown fox");
}

TEST_CASE("sha256 known vectors") {
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("format_pct rounds half-up to two decimals") {
    CHECK(util::format_pct(50.0) == "50.00");
    CHECK(util::format_pct(40.505) == "40.51");
    CHECK(util::format_pct(33.333333) == "33.33");
}

TEST_CASE("atomic_write leaves no temp file behind") {
    auto path = std::filesystem::temp_directory_path() / "eragent_util_test.txt";
    util::atomic_write(path.string(), "payload");
    CHECK(util::read_file(path.string()) == "payload");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
}
