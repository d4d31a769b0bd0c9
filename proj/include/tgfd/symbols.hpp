#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tgfd {

using Symbol = std::uint32_t;

inline constexpr Symbol kNoSymbol = 0xffffffffu;

// Interns labels, type names and attribute names. Append only.
class SymbolTable {
 public:
  Symbol intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    Symbol s = static_cast<Symbol>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), s);
    return s;
  }

  Symbol find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? kNoSymbol : it->second;
  }

  const std::string& name(Symbol s) const { return names_.at(s); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
};

}  // namespace tgfd
