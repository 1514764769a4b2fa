// Copyright 2026 The qndm-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qndm/pauli.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "qndm/error.hpp"

namespace qndm {

char to_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 'I';
        case Pauli::X:
            return 'X';
        case Pauli::Y:
            return 'Y';
        case Pauli::Z:
            return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case 'i':
            return Pauli::I;
        case 'X':
        case 'x':
            return Pauli::X;
        case 'Y':
        case 'y':
            return Pauli::Y;
        case 'Z':
        case 'z':
            return Pauli::Z;
        default:
            throw ConfigError(std::string("invalid Pauli letter '") + c + "'");
    }
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
    require_config(!letters_.empty(), "Pauli string must have at least one letter");
    require_config(letters_.size() <= kMaxQubits, "Pauli string too long");
    for (std::size_t j = 0; j < letters_.size(); ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        switch (letters_[j]) {
            case Pauli::I:
                break;
            case Pauli::X:
                flip_mask_ |= bit;
                break;
            case Pauli::Y:
                flip_mask_ |= bit;
                sign_mask_ |= bit;
                ++y_count_;
                break;
            case Pauli::Z:
                sign_mask_ |= bit;
                break;
        }
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
        letters.push_back(pauli_from_char(c));
    }
    return PauliString(std::move(letters));
}

std::string PauliString::to_string() const {
    std::string out;
    out.reserve(letters_.size());
    for (auto p : letters_) {
        out.push_back(to_char(p));
    }
    return out;
}

Observable::Observable(std::vector<Term> terms) : terms_(std::move(terms)) {
    require_config(!terms_.empty(), "observable needs at least one term");
    n_ = terms_.front().string.size();
    for (const auto &t : terms_) {
        require_config(t.string.size() == n_, "all Pauli strings of an observable must have the same length");
        require_config(std::isfinite(t.coeff), "observable coefficients must be finite");
    }
}

Observable Observable::parse(std::string_view text) {
    std::vector<Term> terms;
    std::string line;
    auto flush = [&](const std::string &raw) {
        auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#') {
            return;
        }
        std::istringstream in(raw);
        double coeff = 0;
        std::string letters;
        std::string extra;
        if (!(in >> coeff >> letters) || (in >> extra)) {
            throw ConfigError("malformed observable term '" + raw + "' (expected '<coeff> <letters>')");
        }
        terms.push_back(Term{coeff, PauliString::parse(letters)});
    };
    for (char c : text) {
        if (c == '\n' || c == ';') {
            flush(line);
            line.clear();
        } else {
            line.push_back(c);
        }
    }
    flush(line);
    return Observable(std::move(terms));
}

std::string Observable::to_text() const {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto &t : terms_) {
        out << t.coeff << ' ' << t.string.to_string() << '\n';
    }
    return out.str();
}

double Observable::abs_coeff_sum() const {
    double s = 0;
    for (const auto &t : terms_) {
        s += std::abs(t.coeff);
    }
    return s;
}

double Observable::sq_coeff_sum() const {
    double s = 0;
    for (const auto &t : terms_) {
        s += t.coeff * t.coeff;
    }
    return s;
}

Observable Observable::permuted(const std::vector<std::size_t> &order) const {
    require(order.size() == terms_.size(), "permutation size mismatch");
    std::vector<bool> seen(order.size(), false);
    std::vector<Term> out;
    out.reserve(order.size());
    for (auto i : order) {
        require(i < terms_.size() && !seen[i], "not a permutation of the term indices");
        seen[i] = true;
        out.push_back(terms_[i]);
    }
    return Observable(std::move(out));
}

Bitstring Bitstring::parse(std::string_view text) {
    require(text.size() <= 64, "bitstring longer than 64 bits");
    Bitstring b;
    b.length = text.size();
    for (std::size_t j = 0; j < text.size(); ++j) {
        if (text[j] == '1') {
            b.bits |= std::uint64_t{1} << j;
        } else {
            require(text[j] == '0', "bitstring characters must be 0 or 1");
        }
    }
    return b;
}

int eigenvalue_from_bits(const PauliString &p, const Bitstring &bits) {
    require(bits.length == p.size(), "bitstring length does not match Pauli string length");
    return (std::popcount(bits.bits & p.support_mask()) & 1) ? -1 : +1;
}

Observable random_observable(std::size_t n, std::size_t num_terms, double coeff_std, Rng &rng) {
    require_config(n >= 1, "random observable needs n >= 1");
    require_config(n <= 31, "random observable supports at most 31 qubits");
    require_config(num_terms >= 1, "random observable needs J >= 1");
    require_config(coeff_std > 0 && std::isfinite(coeff_std), "coefficient std must be positive");
    const std::uint64_t non_identity = (std::uint64_t{1} << (2 * n)) - 1;
    require_config(num_terms <= non_identity, "J = " + std::to_string(num_terms) + " exceeds the " +
                                                  std::to_string(non_identity) +
                                                  " distinct non-identity Pauli strings on " +
                                                  std::to_string(n) + " qubits");

    std::uniform_int_distribution<std::uint64_t> pick(1, non_identity);
    std::normal_distribution<double> coeff(0.0, coeff_std);
    std::unordered_set<std::uint64_t> used;
    std::vector<Term> terms;
    terms.reserve(num_terms);
    while (terms.size() < num_terms) {
        std::uint64_t code = pick(rng);
        if (!used.insert(code).second) {
            continue;
        }
        std::vector<Pauli> letters(n);
        for (std::size_t j = 0; j < n; ++j) {
            letters[j] = static_cast<Pauli>((code >> (2 * j)) & 3U);
        }
        terms.push_back(Term{coeff(rng), PauliString(std::move(letters))});
    }
    return Observable(std::move(terms));
}

}  // namespace qndm
