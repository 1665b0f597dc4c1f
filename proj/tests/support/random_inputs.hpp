#pragma once

#include <random>
#include <string>

namespace gf_test {

// Random but valid inputs for the fixture languages. Spacing, comments and
// item counts vary.

// mc.examples.bookstore2.ExtendedBookstore.Bookstore
std::string random_extended_store(std::mt19937_64& rng);

// configs/store.cfg. Bibtex field names and words are drawn partly from the
// host keywords.
std::string random_embedded_store(std::mt19937_64& rng);

// configs/keyed.cfg
std::string random_keyed_store(std::mt19937_64& rng);

}  // namespace gf_test
