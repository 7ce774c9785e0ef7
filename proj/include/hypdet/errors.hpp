#pragma once

#include <stdexcept>
#include <string>

namespace hypdet {

// Requested tolerance cannot be met within the configured term budget.
struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// A counting or summation query reaches past the completeness cutoff of a
// length spectrum; answering it would silently undercount.
struct cutoff_exceeded : std::runtime_error {
    explicit cutoff_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct incomplete_spectrum : std::runtime_error {
    explicit incomplete_spectrum(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration ball grew past the configured node budget.
struct resource_limit : std::runtime_error {
    explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

struct not_connected : std::runtime_error {
    explicit not_connected(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hypdet
