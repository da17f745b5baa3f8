#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace xfbci {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Process-wide status discipline: 0 ok, 1 runtime failure, 2 bad configuration.
// The C API and the CLI exit codes reuse these values directly.
enum class Errc : int { ok = 0, runtime = 1, config = 2 };

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace xfbci
