#include "gt/channels.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace gt {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Matrix from_rows(const nlohmann::json& rows, const char* name) {
  require(rows.is_array() && !rows.empty(), fmt::format("'{}' must be a nonempty array of rows", name));
  const auto n = rows.size();
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    require(rows[r].is_array() && rows[r].size() == n, fmt::format("'{}' must be square", name));
    for (std::size_t c = 0; c < n; ++c) {
      require(rows[r][c].is_number(), fmt::format("'{}' entries must be numbers", name));
      m(r, c) = rows[r][c].get<double>();
    }
  }
  return m;
}

nlohmann::json to_rows(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> param_names(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::thermal: return {"eta", "n_b"};
    case ChannelKind::amplifier: return {"gain", "n_b"};
    case ChannelKind::additive_noise: return {"xi"};
    case ChannelKind::pure_loss: return {"eta"};
    case ChannelKind::pure_amplifier: return {"gain"};
    case ChannelKind::identity: return {};
    case ChannelKind::tensor:
    case ChannelKind::raw: return {};
  }
  return {};
}

}  // namespace

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::identity: return "identity";
    case ChannelKind::thermal: return "thermal";
    case ChannelKind::amplifier: return "amplifier";
    case ChannelKind::additive_noise: return "additive_noise";
    case ChannelKind::pure_loss: return "pure_loss";
    case ChannelKind::pure_amplifier: return "pure_amplifier";
    case ChannelKind::tensor: return "tensor";
    case ChannelKind::raw: return "raw";
  }
  return "raw";
}

ChannelKind channel_kind_from_string(const std::string& name) {
  for (auto k : {ChannelKind::identity, ChannelKind::thermal, ChannelKind::amplifier,
                 ChannelKind::additive_noise, ChannelKind::pure_loss, ChannelKind::pure_amplifier,
                 ChannelKind::tensor}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument(fmt::format("unknown channel kind '{}'", name));
}

std::string ChannelDescriptor::label() const {
  if (kind == ChannelKind::tensor) {
    std::string s = "tensor(";
    for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "," : "") + factors[i].label();
    return s + ")";
  }
  std::string s = to_string(kind);
  if (!params.empty()) {
    s += "(";
    for (std::size_t i = 0; i < params.size(); ++i) s += fmt::format("{}{:.17g}", i ? "," : "", params[i]);
    s += ")";
  }
  return s;
}

int ChannelDescriptor::modes() const {
  if (kind != ChannelKind::tensor) return 1;
  int m = 0;
  for (const auto& f : factors) m += f.modes();
  return m;
}

CpDiagnostics check_complete_positivity(const Matrix& x, const Matrix& y) {
  const Matrix omega = SymplecticForm(static_cast<int>(x.rows() / 2)).matrix();
  CMatrix h = y.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * (omega - x.transpose() * omega * x).cast<std::complex<double>>();
  h = 0.5 * (h + h.adjoint()).eval();
  CpDiagnostics out;
  out.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  out.min_y_eigenvalue = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (y + y.transpose()),
                                                               Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  const double scale = std::max({1.0, x.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff(),
                                 y.cwiseAbs().maxCoeff()});
  out.valid = out.min_eigenvalue >= -kPhysicalTol * scale && out.min_y_eigenvalue >= -kPhysicalTol * scale;
  return out;
}

GaussianChannel::GaussianChannel(Matrix x, Matrix y, Vector d, std::optional<ChannelDescriptor> descriptor)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)), descriptor_(std::move(descriptor)) {
  const auto n = x_.rows();
  require(n > 0 && n % 2 == 0 && x_.cols() == n, "X must be a nonempty 2m x 2m matrix");
  require(y_.rows() == n && y_.cols() == n, "Y must have the same shape as X");
  require(d_.size() == n, "d must have length 2m");
  const double scale = std::max(1.0, y_.cwiseAbs().maxCoeff());
  require((y_ - y_.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol * scale, "Y must be symmetric");
  y_ = 0.5 * (y_ + y_.transpose()).eval();
  const auto cp = check_complete_positivity(x_, y_);
  require(cp.valid, fmt::format("channel violates the CP condition (min eigenvalue {:.6g})", cp.min_eigenvalue));
}

GaussianChannel identity_channel(int modes) {
  const int n = 2 * modes;
  return GaussianChannel(Matrix::Identity(n, n), Matrix::Zero(n, n), Vector::Zero(n),
                         modes == 1 ? std::optional(ChannelDescriptor{ChannelKind::identity, {}, {}})
                                    : std::nullopt);
}

GaussianChannel make_thermal(double eta, double n_b) {
  require(eta > 0.0 && eta < 1.0, fmt::format("thermal channel needs eta in (0,1), got {}", eta));
  require(n_b >= 0.0, "thermal channel needs N_B >= 0");
  const Matrix id = Matrix::Identity(2, 2);
  return GaussianChannel(std::sqrt(eta) * id, (1.0 - eta) * (2.0 * n_b + 1.0) * id, Vector::Zero(2),
                         ChannelDescriptor{ChannelKind::thermal, {eta, n_b}, {}});
}

GaussianChannel make_amplifier(double gain, double n_b) {
  require(gain > 1.0, fmt::format("amplifier needs G > 1, got {}", gain));
  require(n_b >= 0.0, "amplifier needs N_B >= 0");
  const Matrix id = Matrix::Identity(2, 2);
  return GaussianChannel(std::sqrt(gain) * id, (gain - 1.0) * (2.0 * n_b + 1.0) * id, Vector::Zero(2),
                         ChannelDescriptor{ChannelKind::amplifier, {gain, n_b}, {}});
}

GaussianChannel make_additive_noise(double xi, int modes) {
  require(xi > 0.0, fmt::format("additive-noise channel needs xi > 0, got {}", xi));
  require(modes >= 1, "mode count must be positive");
  const int n = 2 * modes;
  std::optional<ChannelDescriptor> desc;
  if (modes == 1) desc = ChannelDescriptor{ChannelKind::additive_noise, {xi}, {}};
  return GaussianChannel(Matrix::Identity(n, n), 2.0 * xi * Matrix::Identity(n, n), Vector::Zero(n), desc);
}

GaussianChannel make_pure_loss(double eta) {
  auto ch = make_thermal(eta, 0.0);
  return GaussianChannel(ch.x(), ch.y(), ch.d(), ChannelDescriptor{ChannelKind::pure_loss, {eta}, {}});
}

GaussianChannel make_pure_amplifier(double gain) {
  auto ch = make_amplifier(gain, 0.0);
  return GaussianChannel(ch.x(), ch.y(), ch.d(), ChannelDescriptor{ChannelKind::pure_amplifier, {gain}, {}});
}

GaussianChannel make_symplectic_channel(const Matrix& s) {
  require(symplectic_residual(s) < 1e-9, "matrix is not symplectic");
  return GaussianChannel(s.transpose(), Matrix::Zero(s.rows(), s.cols()), Vector::Zero(s.rows()));
}

GaussianChannel make_channel(const ChannelDescriptor& desc) {
  const auto expect = [&](std::size_t n) {
    require(desc.params.size() == n,
            fmt::format("channel '{}' takes {} parameters, got {}", to_string(desc.kind), n, desc.params.size()));
  };
  switch (desc.kind) {
    case ChannelKind::identity: expect(0); return identity_channel(1);
    case ChannelKind::thermal: expect(2); return make_thermal(desc.params[0], desc.params[1]);
    case ChannelKind::amplifier: expect(2); return make_amplifier(desc.params[0], desc.params[1]);
    case ChannelKind::additive_noise: expect(1); return make_additive_noise(desc.params[0]);
    case ChannelKind::pure_loss: expect(1); return make_pure_loss(desc.params[0]);
    case ChannelKind::pure_amplifier: expect(1); return make_pure_amplifier(desc.params[0]);
    case ChannelKind::tensor: {
      require(!desc.factors.empty(), "tensor channel needs at least one factor");
      GaussianChannel out = make_channel(desc.factors.front());
      for (std::size_t i = 1; i < desc.factors.size(); ++i) out = tensor(out, make_channel(desc.factors[i]));
      return out;
    }
    case ChannelKind::raw: break;
  }
  throw std::invalid_argument("raw channels cannot be built from a descriptor");
}

GaussianState apply(const GaussianChannel& channel, const GaussianState& state) {
  require(channel.modes() == state.modes(),
          fmt::format("channel acts on {} modes, state has {}", channel.modes(), state.modes()));
  return GaussianState(channel.x().transpose() * state.mean() + channel.d(),
                       channel.x().transpose() * state.cov() * channel.x() + channel.y());
}

GaussianChannel embed(const GaussianChannel& channel, std::span<const int> target_modes, int total_modes) {
  require(static_cast<int>(target_modes.size()) == channel.modes(),
          "number of target modes must match the channel");
  for (int t : target_modes) {
    if (t < 0 || t >= total_modes) throw std::out_of_range(fmt::format("target mode {} out of range", t));
  }
  return GaussianChannel(embed_matrix(channel.x(), target_modes, total_modes, 1.0),
                         embed_matrix(channel.y(), target_modes, total_modes, 0.0),
                         embed_vector(channel.d(), target_modes, total_modes));
}

GaussianState apply_on_subsystem(const GaussianChannel& channel, const GaussianState& state,
                                 std::span<const int> target_modes) {
  return apply(embed(channel, target_modes, state.modes()), state);
}

GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first) {
  require(second.modes() == first.modes(), "cannot compose channels on different mode counts");
  const Matrix& x1 = first.x();
  const Matrix& x2 = second.x();
  return GaussianChannel(x1 * x2, x2.transpose() * first.y() * x2 + second.y(),
                         x2.transpose() * first.d() + second.d());
}

GaussianChannel tensor(const GaussianChannel& a, const GaussianChannel& b) {
  const int ma = a.modes();
  const int mb = b.modes();
  const int m = ma + mb;
  std::vector<int> first(ma), second(mb);
  std::iota(first.begin(), first.end(), 0);
  std::iota(second.begin(), second.end(), ma);
  const auto ea = embed(a, first, m);
  const auto eb = embed(b, second, m);
  std::optional<ChannelDescriptor> desc;
  if (a.descriptor() && b.descriptor()) {
    ChannelDescriptor t{ChannelKind::tensor, {}, {}};
    for (const auto* part : {&*a.descriptor(), &*b.descriptor()}) {
      if (part->kind == ChannelKind::tensor) {
        t.factors.insert(t.factors.end(), part->factors.begin(), part->factors.end());
      } else {
        t.factors.push_back(*part);
      }
    }
    desc = std::move(t);
  }
  return GaussianChannel(ea.x() * eb.x(), eb.x().transpose() * ea.y() * eb.x() + eb.y(),
                         eb.x().transpose() * ea.d() + eb.d(), desc);
}

Dilation dilate(const GaussianChannel& channel) {
  const auto& desc = channel.descriptor();
  if (!desc) throw std::invalid_argument("dilate: channel has no named-family descriptor");
  std::vector<ChannelDescriptor> parts =
      desc->kind == ChannelKind::tensor ? desc->factors : std::vector<ChannelDescriptor>{*desc};
  const int m = static_cast<int>(parts.size());
  Matrix s = Matrix::Identity(4 * m, 4 * m);
  std::optional<GaussianState> env;
  for (int k = 0; k < m; ++k) {
    const auto& p = parts[k];
    Matrix q(2, 2);    // acts on (q_sys, q_env)
    Matrix pm(2, 2);   // acts on (p_sys, p_env)
    double n_b = 0.0;
    switch (p.kind) {
      case ChannelKind::thermal:
      case ChannelKind::pure_loss: {
        const double eta = p.params[0];
        n_b = p.kind == ChannelKind::thermal ? p.params[1] : 0.0;
        const double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
        q << t, r, -r, t;
        pm = q;
        break;
      }
      case ChannelKind::amplifier:
      case ChannelKind::pure_amplifier: {
        const double g = p.params[0];
        n_b = p.kind == ChannelKind::amplifier ? p.params[1] : 0.0;
        const double c = std::sqrt(g), sh = std::sqrt(g - 1.0);
        q << c, sh, sh, c;
        pm << c, -sh, -sh, c;
        break;
      }
      default:
        throw std::invalid_argument(fmt::format("dilate: unsupported channel family '{}'", to_string(p.kind)));
    }
    Matrix local(4, 4);
    local.setZero();
    local.topLeftCorner(2, 2) = q;
    local.bottomRightCorner(2, 2) = pm;
    const std::array<int, 2> pair{k, m + k};
    s = embed_matrix(local, pair, 2 * m, 1.0) * s;
    auto theta = GaussianState::thermal(n_b);
    env = env ? tensor(*env, theta) : theta;
  }
  return Dilation{std::move(s), std::move(*env), m};
}

GaussianState dilation_output(const Dilation& dilation, const GaussianState& input) {
  require(input.modes() == dilation.system_modes, "input does not match the dilation's system size");
  const auto joint = transform(tensor(input, dilation.env_state), dilation.symplectic);
  std::vector<int> sys(dilation.system_modes);
  std::iota(sys.begin(), sys.end(), 0);
  return reduce(joint, sys);
}

double check_displacement_covariance(const GaussianChannel& channel, const Vector& z,
                                     const GaussianState& state) {
  const auto lhs = apply(channel, displace(state, z));
  const auto rhs = displace(apply(channel, state), channel.x().transpose() * z);
  return std::max((lhs.mean() - rhs.mean()).cwiseAbs().maxCoeff(),
                  (lhs.cov() - rhs.cov()).cwiseAbs().maxCoeff());
}

double max_abs_diff(const GaussianChannel& a, const GaussianChannel& b) {
  require(a.modes() == b.modes(), "channels act on different mode counts");
  return std::max({(a.x() - b.x()).cwiseAbs().maxCoeff(), (a.y() - b.y()).cwiseAbs().maxCoeff(),
                   (a.d() - b.d()).cwiseAbs().maxCoeff()});
}

nlohmann::json descriptor_to_json(const ChannelDescriptor& desc) {
  nlohmann::json out{{"kind", to_string(desc.kind)}};
  if (desc.kind == ChannelKind::tensor) {
    out["factors"] = nlohmann::json::array();
    for (const auto& f : desc.factors) out["factors"].push_back(descriptor_to_json(f));
    return out;
  }
  const auto names = param_names(desc.kind);
  nlohmann::json params = nlohmann::json::object();
  for (std::size_t i = 0; i < names.size() && i < desc.params.size(); ++i) params[names[i]] = desc.params[i];
  out["params"] = params;
  return out;
}

ChannelDescriptor descriptor_from_json(const nlohmann::json& doc) {
  require(doc.is_object(), "channel must be a JSON object");
  require(doc.contains("kind") && doc["kind"].is_string(), "channel needs a string 'kind'");
  ChannelDescriptor desc;
  desc.kind = channel_kind_from_string(doc["kind"].get<std::string>());
  require(desc.kind != ChannelKind::raw, "use X/Y/d for raw channels");
  for (const auto& [key, _] : doc.items()) {
    const bool allowed = key == "kind" || (desc.kind == ChannelKind::tensor ? key == "factors" : key == "params");
    require(allowed, fmt::format("unknown field '{}' in channel '{}'", key, to_string(desc.kind)));
  }
  if (desc.kind == ChannelKind::tensor) {
    require(doc.contains("factors") && doc["factors"].is_array(), "tensor channel needs 'factors'");
    for (const auto& f : doc["factors"]) desc.factors.push_back(descriptor_from_json(f));
    return desc;
  }
  const auto names = param_names(desc.kind);
  const nlohmann::json params = doc.contains("params") ? doc["params"] : nlohmann::json::object();
  require(params.is_object(), "'params' must be an object");
  for (const auto& [key, _] : params.items()) {
    require(std::find(names.begin(), names.end(), key) != names.end(),
            fmt::format("unknown parameter '{}' for channel '{}'", key, to_string(desc.kind)));
  }
  for (const auto& n : names) {
    require(params.contains(n) && params[n].is_number(),
            fmt::format("channel '{}' needs numeric parameter '{}'", to_string(desc.kind), n));
    desc.params.push_back(params[n].get<double>());
  }
  return desc;
}

nlohmann::json channel_to_json(const GaussianChannel& channel) {
  if (channel.descriptor() && channel.descriptor()->kind != ChannelKind::raw) {
    return descriptor_to_json(*channel.descriptor());
  }
  nlohmann::json d = nlohmann::json::array();
  for (Eigen::Index i = 0; i < channel.d().size(); ++i) d.push_back(channel.d()(i));
  return {{"X", to_rows(channel.x())}, {"Y", to_rows(channel.y())}, {"d", d}};
}

GaussianChannel channel_from_json(const nlohmann::json& doc) {
  require(doc.is_object(), "channel must be a JSON object");
  if (doc.contains("kind")) return make_channel(descriptor_from_json(doc));
  for (const auto& [key, _] : doc.items()) {
    require(key == "X" || key == "Y" || key == "d", fmt::format("unknown field '{}' in raw channel", key));
  }
  require(doc.contains("X") && doc.contains("Y"), "raw channel needs 'X' and 'Y'");
  Matrix x = from_rows(doc["X"], "X");
  Matrix y = from_rows(doc["Y"], "Y");
  Vector d = Vector::Zero(x.rows());
  if (doc.contains("d")) {
    const auto& arr = doc["d"];
    require(arr.is_array() && static_cast<Eigen::Index>(arr.size()) == x.rows(), "'d' must have length 2m");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      require(arr[i].is_number(), "'d' entries must be numbers");
      d(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    }
  }
  return GaussianChannel(std::move(x), std::move(y), std::move(d));
}

}  // namespace gt
