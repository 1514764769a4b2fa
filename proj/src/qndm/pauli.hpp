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

#ifndef QNDM_PAULI_HPP
#define QNDM_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qndm/random.hpp"

namespace qndm {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tensor product of single-qubit Paulis. Letter j acts on qubit j, which is
/// bit j of a basis-state index.
class PauliString {
   public:
    static constexpr std::size_t kMaxQubits = 62;

    explicit PauliString(std::vector<Pauli> letters);
    static PauliString parse(std::string_view text);

    std::size_t size() const { return letters_.size(); }
    Pauli operator[](std::size_t j) const { return letters_[j]; }
    const std::vector<Pauli> &letters() const { return letters_; }

    /// Bits flipped by the string (X or Y sites).
    std::uint64_t flip_mask() const { return flip_mask_; }
    /// Bits contributing a (-1)^bit sign (Y or Z sites).
    std::uint64_t sign_mask() const { return sign_mask_; }
    /// Non-identity sites.
    std::uint64_t support_mask() const { return flip_mask_ | sign_mask_; }
    std::size_t y_count() const { return y_count_; }
    bool is_identity() const { return support_mask() == 0; }

    std::string to_string() const;

    friend bool operator==(const PauliString &a, const PauliString &b) { return a.letters_ == b.letters_; }

   private:
    std::vector<Pauli> letters_;
    std::uint64_t flip_mask_ = 0;
    std::uint64_t sign_mask_ = 0;
    std::size_t y_count_ = 0;
};

struct Term {
    double coeff;
    PauliString string;

    friend bool operator==(const Term &a, const Term &b) { return a.coeff == b.coeff && a.string == b.string; }
};

/// Real-weighted sum of Pauli strings over a fixed qubit count. Term order is
/// significant: detector couplings are applied in this order.
class Observable {
   public:
    explicit Observable(std::vector<Term> terms);

    /// Text format: one `<coeff> <letters>` per line, `#` starts a comment
    /// line. `;` also separates terms so single-line CLI arguments work.
    static Observable parse(std::string_view text);
    std::string to_text() const;

    std::size_t num_qubits() const { return n_; }
    std::size_t num_terms() const { return terms_.size(); }
    const std::vector<Term> &terms() const { return terms_; }
    const Term &operator[](std::size_t i) const { return terms_[i]; }

    double abs_coeff_sum() const;
    double sq_coeff_sum() const;

    /// Same terms in a different order; `order` must be a permutation.
    Observable permuted(const std::vector<std::size_t> &order) const;

    friend bool operator==(const Observable &a, const Observable &b) { return a.terms_ == b.terms_; }

   private:
    std::vector<Term> terms_;
    std::size_t n_ = 0;
};

/// Measured bit values; bit j belongs to qubit j.
struct Bitstring {
    std::uint64_t bits = 0;
    std::size_t length = 0;

    /// Character j of `text` is qubit j ("10" means qubit 0 read 1).
    static Bitstring parse(std::string_view text);
    bool operator[](std::size_t j) const { return (bits >> j) & 1U; }
};

/// Eigenvalue of `p` selected by computational-basis outcomes measured after
/// `basis_change_circuit(p)`: product of (-1)^bit over non-identity sites.
int eigenvalue_from_bits(const PauliString &p, const Bitstring &bits);

/// J distinct non-identity strings drawn uniformly without replacement, with
/// coefficients i.i.d. N(0, coeff_std^2).
Observable random_observable(std::size_t n, std::size_t num_terms, double coeff_std, Rng &rng);

}  // namespace qndm

#endif
