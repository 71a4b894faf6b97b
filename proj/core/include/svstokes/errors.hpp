#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace svstokes {

/// Base class of every domain error raised by the library. The CLI maps
/// these to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

class NonConformingMesh : public Error {
public:
  NonConformingMesh(const std::string& what, std::vector<int> ids)
      : Error("non-conforming mesh: " + what), ids_(std::move(ids)) {}
  const std::vector<int>& offending_ids() const noexcept { return ids_; }

private:
  std::vector<int> ids_;
};

class DegenerateTriangle : public Error {
public:
  explicit DegenerateTriangle(int triangle)
      : Error("degenerate triangle " + std::to_string(triangle)), triangle_(triangle) {}
  int triangle() const noexcept { return triangle_; }

private:
  int triangle_;
};

class UnknownVertex : public Error {
public:
  explicit UnknownVertex(int z) : Error("unknown vertex " + std::to_string(z)) {}
};

class UnknownTriangle : public Error {
public:
  explicit UnknownTriangle(int k) : Error("unknown triangle " + std::to_string(k)) {}
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

class AllVerticesCritical : public Error {
public:
  AllVerticesCritical() : Error("every vertex is critical; theta_min is undefined") {}
};

class MissingCompanion : public Error {
public:
  explicit MissingCompanion(int z)
      : Error("super-critical vertex " + std::to_string(z) +
              " has no adjacent triangle outside its patch"),
        vertex_(z) {}
  int vertex() const noexcept { return vertex_; }

private:
  int vertex_;
};

class NotRobinson : public Error {
public:
  explicit NotRobinson(int z)
      : Error("super-critical vertex " + std::to_string(z) + " is not a Robinson vertex"),
        vertex_(z) {}
  int vertex() const noexcept { return vertex_; }

private:
  int vertex_;
};

class SingularGram : public Error {
public:
  using Error::Error;
};

class SingularSystem : public Error {
public:
  SingularSystem(const std::string& cause, double smallest)
      : Error("singular saddle-point system (smallest eigenvalue estimate " +
              std::to_string(smallest) + "): " + cause),
        smallest_(smallest) {}
  double smallest_eigenvalue() const noexcept { return smallest_; }

private:
  double smallest_;
};

class UnknownCase : public Error {
public:
  explicit UnknownCase(const std::string& id) : Error("unknown manufactured case '" + id + "'") {}
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

}  // namespace svstokes
