#pragma once

// Joint photon-path x absorber-level x pointer state.
//
// Each occupied (path, level) slot holds the photon's energy wavefunction for
// that branch; absent slots are zero.  The absorbed branch is never kept as a
// state, only as the probability it carried away, so that
//
//     total_norm_sq(state) + state.absorbed_prob() == 1
//
// after every complete physical step.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "ewm/absorber.hpp"
#include "ewm/errors.hpp"
#include "ewm/pointer_grid.hpp"

namespace ewm {

enum class PathLabel { Input, ArmI, ArmII, Bright, Dark };

inline constexpr std::array kAllPaths{PathLabel::Input, PathLabel::ArmI, PathLabel::ArmII,
                                      PathLabel::Bright, PathLabel::Dark};
inline constexpr std::array kAllLevels{Level::Ground, Level::Excited};

inline std::string_view to_string(PathLabel path)
{
    switch (path) {
    case PathLabel::Input: return "Input";
    case PathLabel::ArmI: return "ArmI";
    case PathLabel::ArmII: return "ArmII";
    case PathLabel::Bright: return "Bright";
    case PathLabel::Dark: return "Dark";
    }
    return "?";
}

inline std::string_view to_string(Level level) { return level == Level::Ground ? "g" : "f"; }

inline PathLabel path_from_string(std::string_view s)
{
    for (auto p : kAllPaths)
        if (to_string(p) == s)
            return p;
    throw InvalidArgument("unknown path label '" + std::string(s) + "'");
}

inline Level level_from_string(std::string_view s)
{
    if (s == "g")
        return Level::Ground;
    if (s == "f")
        return Level::Excited;
    throw InvalidArgument("unknown absorber level '" + std::string(s) + "'");
}

struct BranchKey {
    PathLabel path;
    Level level;
    auto operator<=>(const BranchKey&) const = default;
};

// Discrete (path x level) amplitudes with the pointer factored out.  Slot
// order is path-major: (Input,g), (Input,f), (ArmI,g), ... , (Dark,f).
class DiscreteVec {
public:
    static constexpr std::size_t kDim = kAllPaths.size() * kAllLevels.size();

    static constexpr std::size_t slot(PathLabel path, Level level)
    {
        return 2 * static_cast<std::size_t>(path) + (level == Level::Ground ? 0 : 1);
    }

    complex operator()(PathLabel path, Level level) const { return amps_[slot(path, level)]; }
    complex& operator()(PathLabel path, Level level) { return amps_[slot(path, level)]; }
    complex operator[](std::size_t i) const { return amps_[i]; }
    complex& operator[](std::size_t i) { return amps_[i]; }

    // Adds path (x) absorber to this vector.
    DiscreteVec& add(PathLabel path, const AbsorberVec& absorber, complex weight = 1.0)
    {
        (*this)(path, Level::Ground) += weight * absorber.g_amp;
        (*this)(path, Level::Excited) += weight * absorber.f_amp;
        return *this;
    }

    friend DiscreteVec operator*(complex c, DiscreteVec v)
    {
        for (auto& a : v.amps_)
            a *= c;
        return v;
    }

    double norm_sq() const
    {
        double s = 0.0;
        for (const auto& a : amps_)
            s += std::norm(a);
        return s;
    }

private:
    std::array<complex, kDim> amps_{};
};

inline complex inner(const DiscreteVec& lhs, const DiscreteVec& rhs)
{
    complex s{};
    for (std::size_t i = 0; i < DiscreteVec::kDim; ++i)
        s += std::conj(lhs[i]) * rhs[i];
    return s;
}

class JointState {
public:
    using BranchMap = std::map<BranchKey, PointerWavefunction>;

    explicit JointState(FrequencyGrid grid) : grid_(grid) {}

    const FrequencyGrid& grid() const { return grid_; }
    const BranchMap& branches() const { return branches_; }
    bool empty() const { return branches_.empty(); }

    double absorbed_prob() const { return absorbed_prob_; }
    void set_absorbed_prob(double p)
    {
        if (!(p >= 0.0) || p > 1.0 + 1e-10)
            throw InvalidArgument("absorbed probability outside [0, 1]");
        absorbed_prob_ = p;
    }
    void add_absorbed_prob(double p) { set_absorbed_prob(absorbed_prob_ + p); }

    const PointerWavefunction* find(PathLabel path, Level level) const
    {
        const auto it = branches_.find({path, level});
        return it == branches_.end() ? nullptr : &it->second;
    }

    // Branch amplitude, or a zero wavefunction for an absent slot.
    PointerWavefunction branch(PathLabel path, Level level) const
    {
        if (const auto* psi = find(path, level))
            return *psi;
        return PointerWavefunction(grid_);
    }

    void set(PathLabel path, Level level, PointerWavefunction psi)
    {
        require_grid(psi);
        branches_.insert_or_assign(BranchKey{path, level}, std::move(psi));
    }

    void accumulate(PathLabel path, Level level, const PointerWavefunction& psi)
    {
        require_grid(psi);
        auto it = branches_.find({path, level});
        if (it == branches_.end())
            branches_.emplace(BranchKey{path, level}, psi);
        else
            it->second += psi;
    }

    void erase(PathLabel path) { std::erase_if(branches_, [&](const auto& kv) { return kv.first.path == path; }); }

    bool occupies(PathLabel path) const
    {
        for (const auto& [key, psi] : branches_)
            if (key.path == path)
                return true;
        return false;
    }

private:
    void require_grid(const PointerWavefunction& psi) const
    {
        if (!(psi.grid() == grid_))
            throw GridMismatch("branch wavefunction is not on the joint state's grid");
    }

    FrequencyGrid grid_;
    BranchMap branches_;
    double absorbed_prob_ = 0.0;
};

// pointer (x) |path> (x) absorber; zero absorber components are left absent.
inline JointState product_state(const PointerWavefunction& pointer, PathLabel path, const AbsorberVec& absorber)
{
    JointState state(pointer.grid());
    for (auto level : kAllLevels) {
        const complex c = absorber[level];
        if (c != complex{})
            state.set(path, level, c * pointer);
    }
    return state;
}

inline double total_norm_sq(const JointState& state)
{
    double sum = 0.0;
    for (const auto& [key, psi] : state.branches())
        sum += norm_sq(psi);
    return sum;
}

// 2x2 density matrix in the {|g>, |f>} basis.
struct AbsorberDensity {
    std::array<std::array<complex, 2>, 2> m{};

    complex operator()(Level row, Level col) const { return m[idx(row)][idx(col)]; }
    complex trace() const { return m[0][0] + m[1][1]; }

    // <v|rho|v>
    complex expectation(const AbsorberVec& v) const
    {
        const std::array<complex, 2> x{v.g_amp, v.f_amp};
        complex s{};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                s += std::conj(x[i]) * m[i][j] * x[j];
        return s;
    }

    // Ascending eigenvalues of the Hermitian part.
    std::array<double, 2> eigenvalues() const
    {
        const double a = m[0][0].real();
        const double d = m[1][1].real();
        const double off = std::abs(0.5 * (m[0][1] + std::conj(m[1][0])));
        const double half_tr = 0.5 * (a + d);
        const double r = std::hypot(0.5 * (a - d), off);
        return {half_tr - r, half_tr + r};
    }

    static std::size_t idx(Level l) { return l == Level::Ground ? 0 : 1; }
};

// rho_jk = sum_path <branch(path,k)|branch(path,j)> / total_norm_sq
inline AbsorberDensity reduced_absorber_density(const JointState& state)
{
    const double total = total_norm_sq(state);
    if (total == 0.0)
        throw ZeroNorm("reduced_absorber_density: state has no surviving amplitude");

    AbsorberDensity rho;
    for (auto path : kAllPaths) {
        const auto* g = state.find(path, Level::Ground);
        const auto* f = state.find(path, Level::Excited);
        if (g)
            rho.m[0][0] += norm_sq(*g);
        if (f)
            rho.m[1][1] += norm_sq(*f);
        if (g && f) {
            const complex gf = overlap(*f, *g);
            rho.m[0][1] += gf;
            rho.m[1][0] += std::conj(gf);
        }
    }
    for (auto& row : rho.m)
        for (auto& x : row)
            x /= total;
    return rho;
}

inline double purity(const AbsorberDensity& rho)
{
    double s = 0.0;
    for (const auto& row : rho.m)
        for (const auto& x : row)
            s += std::norm(x);
    return s;
}

// JSON document: grid header, absorbed probability and one entry per
// occupied branch with amplitudes as [re, im] pairs.
inline nlohmann::json to_json(const JointState& state)
{
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& [key, psi] : state.branches()) {
        nlohmann::json amps = nlohmann::json::array();
        for (const auto& a : psi.amplitudes())
            amps.push_back({a.real(), a.imag()});
        branches.push_back({{"path", to_string(key.path)},
                            {"level", to_string(key.level)},
                            {"amplitudes", std::move(amps)}});
    }
    const auto& grid = state.grid();
    return {{"schema", 1},
            {"grid",
             {{"omega_min", grid.omega_min()},
              {"delta_omega", grid.delta_omega()},
              {"n_points", grid.size()}}},
            {"absorbed_prob", state.absorbed_prob()},
            {"branches", std::move(branches)}};
}

inline JointState joint_state_from_json(const nlohmann::json& doc)
{
    try {
        if (doc.at("schema").get<int>() != 1)
            throw InvalidArgument("joint state JSON: unsupported schema");
        const auto& g = doc.at("grid");
        const FrequencyGrid grid(g.at("omega_min").get<double>(), g.at("delta_omega").get<double>(),
                                 g.at("n_points").get<std::size_t>());
        JointState state(grid);
        for (const auto& b : doc.at("branches")) {
            std::vector<complex> amps;
            amps.reserve(grid.size());
            for (const auto& pair : b.at("amplitudes"))
                amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
            state.set(path_from_string(b.at("path").get<std::string>()),
                      level_from_string(b.at("level").get<std::string>()),
                      PointerWavefunction(grid, std::move(amps)));
        }
        state.set_absorbed_prob(doc.at("absorbed_prob").get<double>());
        return state;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("joint state JSON: ") + e.what());
    }
}

} // namespace ewm
