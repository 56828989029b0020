#pragma once

#include <stdexcept>
#include <string>

namespace cosetkit {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct MixedCarriers : Error {
  explicit MixedCarriers(const std::string& msg = "elements belong to different carriers")
      : Error(msg) {}
};

struct NotASubgroup : Error {
  explicit NotASubgroup(const std::string& msg = "not a subgroup") : Error(msg) {}
};

struct InfiniteIndex : Error {
  explicit InfiniteIndex(const std::string& msg = "index is infinite") : Error(msg) {}
};

struct UnboundSymbol : Error {
  explicit UnboundSymbol(const std::string& name)
      : Error("unbound symbol: " + name) {}
};

struct EmptySet : Error {
  explicit EmptySet(const std::string& msg = "set is empty") : Error(msg) {}
};

struct NotAGraph : Error {
  explicit NotAGraph(const std::string& msg = "set is not the graph of a map") : Error(msg) {}
};

struct SubgroupNotInFamily : Error {
  explicit SubgroupNotInFamily(const std::string& msg = "subgroup is not in the family")
      : Error(msg) {}
};

struct NotTopLevel : Error {
  explicit NotTopLevel(const std::string& msg = "subgroup is not top level") : Error(msg) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(const std::string& msg = "input set is empty") : Error(msg) {}
};

// Violated internal invariant; indicates a bug, not a user error.
struct InternalError : Error {
  explicit InternalError(const std::string& msg) : Error("internal error: " + msg) {}
};

}  // namespace cosetkit
