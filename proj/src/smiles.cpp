// SPDX-License-Identifier: Apache-2.0
#include "molgp/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <string>

#include "molgp/hashing.hpp"

namespace molgp {

namespace {

constexpr std::array<const char*, 119> kElementSymbols = {
    "?",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al",
    "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co",
    "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb",
    "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs",
    "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm",
    "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg",
    "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

int element_number(std::string_view symbol) {
  for (int z = 1; z < static_cast<int>(kElementSymbols.size()); ++z) {
    if (symbol == kElementSymbols[z]) {
      return z;
    }
  }
  return 0;
}

int aromatic_element_number(std::string_view lower) {
  if (lower == "b") return 5;
  if (lower == "c") return 6;
  if (lower == "n") return 7;
  if (lower == "o") return 8;
  if (lower == "p") return 15;
  if (lower == "s") return 16;
  if (lower == "se") return 34;
  if (lower == "as") return 33;
  return 0;
}

struct AtomDraft {
  AtomRecord record;
  bool bracketed = false;
};

struct RingOpening {
  int atom = -1;
  char bond_symbol = 0;
  std::size_t position = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MolGraph run() {
    if (text_.empty()) {
      fail(0, "empty input");
    }
    while (pos_ < text_.size()) {
      step();
    }
    finish_checks();
    fill_implicit_hydrogens();
    std::vector<AtomRecord> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& draft : atoms_) {
      atoms.push_back(draft.record);
    }
    return MolGraph(std::move(atoms), std::move(bonds_));
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& message) const {
    throw SmilesError(at, message);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek_next() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

  static bool is_bond_symbol(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\';
  }

  void step() {
    const char c = peek();
    if (std::isspace(static_cast<unsigned char>(c))) {
      // only trailing whitespace is tolerated
      for (std::size_t i = pos_; i < text_.size(); ++i) {
        if (!std::isspace(static_cast<unsigned char>(text_[i]))) {
          fail(pos_, "unexpected whitespace");
        }
      }
      pos_ = text_.size();
      return;
    }
    if (c == '(') {
      if (prev_ < 0) {
        fail(pos_, "branch opened before any atom");
      }
      if (pending_bond_ != 0) {
        fail(pos_, "bond symbol before branch open");
      }
      branch_stack_.push_back(prev_);
      ++pos_;
      return;
    }
    if (c == ')') {
      if (branch_stack_.empty()) {
        fail(pos_, "unmatched ')'");
      }
      if (pending_bond_ != 0) {
        fail(pos_, "dangling bond symbol before ')'");
      }
      prev_ = branch_stack_.back();
      branch_stack_.pop_back();
      ++pos_;
      return;
    }
    if (is_bond_symbol(c)) {
      if (pending_bond_ != 0) {
        fail(pos_, "two bond symbols in a row");
      }
      pending_bond_ = c;
      ++pos_;
      return;
    }
    if (c == '.') {
      if (pending_bond_ != 0) {
        fail(pos_, "bond symbol before '.'");
      }
      prev_ = -1;
      ++pos_;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      ring_closure();
      return;
    }
    if (c == '[') {
      bracket_atom();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      bare_atom();
      return;
    }
    fail(pos_, std::string("unexpected character '") + c + "'");
  }

  void ring_closure() {
    const std::size_t at = pos_;
    if (prev_ < 0) {
      fail(at, "ring closure before any atom");
    }
    int digit = 0;
    if (peek() == '%') {
      if (!std::isdigit(static_cast<unsigned char>(peek_next())) || pos_ + 2 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        fail(at, "'%' ring closure needs two digits");
      }
      digit = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      digit = peek() - '0';
      ++pos_;
    }

    auto open = ring_open_.find(digit);
    if (open == ring_open_.end()) {
      ring_open_[digit] = RingOpening{prev_, pending_bond_, at};
      pending_bond_ = 0;
      return;
    }
    const RingOpening opening = open->second;
    ring_open_.erase(open);
    if (opening.atom == prev_) {
      fail(at, "ring closure bonds an atom to itself");
    }
    char symbol = pending_bond_;
    if (opening.bond_symbol != 0 && symbol != 0 &&
        bond_order_of(opening.bond_symbol, opening.atom, prev_) !=
            bond_order_of(symbol, opening.atom, prev_)) {
      fail(at, "ring closure bond symbols disagree");
    }
    if (symbol == 0) {
      symbol = opening.bond_symbol;
    }
    add_bond(opening.atom, prev_, symbol, at);
    pending_bond_ = 0;
    ++ring_closure_count_;
  }

  BondOrder bond_order_of(char symbol, int a, int b) const {
    switch (symbol) {
      case '=':
        return BondOrder::kDouble;
      case '#':
        return BondOrder::kTriple;
      case ':':
        return BondOrder::kAromatic;
      case '-':
      case '/':
      case '\\':
        return BondOrder::kSingle;
      default:
        break;
    }
    // no symbol: aromatic if both ends are aromatic, else single
    if (atoms_[a].record.is_aromatic && atoms_[b].record.is_aromatic) {
      return BondOrder::kAromatic;
    }
    return BondOrder::kSingle;
  }

  void add_bond(int a, int b, char symbol, std::size_t at) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    if (!bond_pairs_.insert({lo, hi}).second) {
      fail(at, "duplicate bond between atoms");
    }
    bonds_.push_back(BondRecord{lo, hi, bond_order_of(symbol, a, b)});
  }

  void attach(int atom_index, std::size_t at) {
    if (prev_ >= 0) {
      add_bond(prev_, atom_index, pending_bond_, at);
    } else if (pending_bond_ != 0) {
      fail(at, "bond symbol with no preceding atom");
    }
    pending_bond_ = 0;
    prev_ = atom_index;
  }

  void bare_atom() {
    const std::size_t at = pos_;
    const char c = peek();
    AtomDraft draft;
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string symbol(1, c);
      if ((c == 'C' && peek_next() == 'l') || (c == 'B' && peek_next() == 'r')) {
        symbol += peek_next();
      }
      static const std::set<std::string> organic = {"B", "C",  "N",  "O", "P",
                                                    "S", "F",  "Cl", "Br", "I"};
      if (!organic.count(symbol)) {
        fail(at, "unknown element symbol '" + symbol + "' outside brackets");
      }
      draft.record.atomic_number = element_number(symbol);
      pos_ += symbol.size();
    } else {
      const std::string symbol(1, c);
      const int z = aromatic_element_number(symbol);
      if (z == 0) {
        fail(at, "unknown element symbol '" + symbol + "' outside brackets");
      }
      draft.record.atomic_number = z;
      draft.record.is_aromatic = true;
      ++pos_;
    }
    draft.record.h_count = -1;  // filled later
    atoms_.push_back(draft);
    attach(static_cast<int>(atoms_.size()) - 1, at);
  }

  void bracket_atom() {
    const std::size_t at = pos_;
    ++pos_;  // '['
    AtomDraft draft;
    draft.bracketed = true;

    // isotope
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      int isotope = 0;
      int digits = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        isotope = isotope * 10 + (peek() - '0');
        ++digits;
        ++pos_;
        if (digits > 4) {
          fail(at, "isotope number too long");
        }
      }
      if (isotope <= 0) {
        fail(at, "isotope must be positive");
      }
      draft.record.isotope = isotope;
    }

    // element symbol
    if (std::isupper(static_cast<unsigned char>(peek()))) {
      std::string symbol(1, peek());
      if (std::islower(static_cast<unsigned char>(peek_next())) &&
          element_number(symbol + peek_next()) != 0) {
        symbol += peek_next();
      }
      const int z = element_number(symbol);
      if (z == 0) {
        fail(at, "unknown element symbol '" + symbol + "'");
      }
      draft.record.atomic_number = z;
      pos_ += symbol.size();
    } else if (std::islower(static_cast<unsigned char>(peek()))) {
      std::string symbol(1, peek());
      if (std::islower(static_cast<unsigned char>(peek_next())) &&
          aromatic_element_number(symbol + peek_next()) != 0) {
        symbol += peek_next();
      }
      const int z = aromatic_element_number(symbol);
      if (z == 0) {
        fail(at, "unknown aromatic element symbol '" + symbol + "'");
      }
      draft.record.atomic_number = z;
      draft.record.is_aromatic = true;
      pos_ += symbol.size();
    } else {
      fail(at, "bracket atom is missing an element symbol");
    }

    // chirality: parsed and discarded
    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      }
    }

    // explicit hydrogen count
    int h = 0;
    if (peek() == 'H') {
      ++pos_;
      h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        h = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          h = h * 10 + (peek() - '0');
          ++pos_;
        }
      }
    }
    draft.record.h_count = h;

    // formal charge
    if (peek() == '+' || peek() == '-') {
      const int sign = peek() == '+' ? 1 : -1;
      const char mark = peek();
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = magnitude * 10 + (peek() - '0');
          ++pos_;
        }
      } else {
        while (peek() == mark) {
          ++magnitude;
          ++pos_;
        }
      }
      draft.record.formal_charge = sign * magnitude;
    }

    // atom class: parsed and discarded
    if (peek() == ':') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        fail(at, "atom class needs digits");
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        ++pos_;
      }
    }

    if (peek() != ']') {
      fail(at, "malformed bracket atom (expected ']')");
    }
    ++pos_;

    atoms_.push_back(draft);
    attach(static_cast<int>(atoms_.size()) - 1, at);
  }

  void finish_checks() const {
    if (!ring_open_.empty()) {
      const auto& opening = ring_open_.begin()->second;
      fail(opening.position, "unmatched ring-closure digit " +
                                 std::to_string(ring_open_.begin()->first));
    }
    if (!branch_stack_.empty()) {
      fail(text_.size(), "unmatched '('");
    }
    if (pending_bond_ != 0) {
      fail(text_.size(), "dangling bond symbol at end of input");
    }
    if (atoms_.empty()) {
      fail(0, "no atoms in input");
    }
  }

  // Implicit hydrogens for bare organic-subset atoms. Aromatic bonds count
  // as order 1 plus one extra valence unit for the aromatic flag; standard
  // valences are B3 C4 N3 O2 halogen1, P {3,5} and S {2,4,6} lowest-fitting.
  // Deficits below zero clamp to zero H.
  void fill_implicit_hydrogens() {
    std::vector<int> bond_order_sum(atoms_.size(), 0);
    for (const auto& bond : bonds_) {
      int units = 1;
      if (bond.order == BondOrder::kDouble) units = 2;
      if (bond.order == BondOrder::kTriple) units = 3;
      bond_order_sum[bond.a] += units;
      bond_order_sum[bond.b] += units;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      auto& atom = atoms_[i].record;
      if (atoms_[i].bracketed) {
        continue;  // bracket atoms carry their explicit count (default 0)
      }
      int used = bond_order_sum[i];
      if (atom.is_aromatic) {
        used += 1;
      }
      const int valence = fitting_valence(atom.atomic_number, used);
      atom.h_count = std::max(0, valence - used);
    }
  }

  static int fitting_valence(int atomic_number, int used) {
    switch (atomic_number) {
      case 5:
        return 3;
      case 6:
        return 4;
      case 7:
        return 3;
      case 8:
        return 2;
      case 9:
      case 17:
      case 35:
      case 53:
        return 1;
      case 15:
        return used <= 3 ? 3 : 5;
      case 16:
        return used <= 2 ? 2 : (used <= 4 ? 4 : 6);
      default:
        return 0;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<AtomDraft> atoms_;
  std::vector<BondRecord> bonds_;
  std::set<std::pair<int, int>> bond_pairs_;
  std::vector<int> branch_stack_;
  std::map<int, RingOpening> ring_open_;
  int prev_ = -1;
  char pending_bond_ = 0;
  int ring_closure_count_ = 0;
};

}  // namespace

MolGraph parse_smiles(std::string_view text) { return Parser(text).run(); }

std::vector<std::uint64_t> initial_atom_invariants(const MolGraph& mol) {
  std::vector<std::uint64_t> invariants(mol.atom_count());
  for (int i = 0; i < mol.atom_count(); ++i) {
    const AtomRecord& atom = mol.atom(i);
    Fnv1a64 hash;
    hash.feed_u64(static_cast<std::uint64_t>(atom.atomic_number));
    hash.feed_u64(static_cast<std::uint64_t>(mol.degree(i)));
    hash.feed_u64(static_cast<std::uint64_t>(atom.h_count));
    hash.feed_i64(atom.formal_charge);
    hash.feed_u64(atom.is_aromatic ? 1 : 0);
    hash.feed_u64(mol.atom_in_ring(i) ? 1 : 0);
    invariants[i] = hash.value();
  }
  return invariants;
}

}  // namespace molgp
