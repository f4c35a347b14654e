#include "nlm/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Eigenvectors (e_plus, e_minus) of each Pauli, columns as 2-vectors.
void axis_eigenvectors(PauliAxis axis, Complex plus[2], Complex minus[2]) {
    const Complex i(0.0, 1.0);
    switch (axis) {
        case PauliAxis::Z:
            plus[0] = 1;            plus[1] = 0;
            minus[0] = 0;           minus[1] = 1;
            break;
        case PauliAxis::X:
            plus[0] = kInvSqrt2;    plus[1] = kInvSqrt2;
            minus[0] = kInvSqrt2;   minus[1] = -kInvSqrt2;
            break;
        case PauliAxis::Y:
            plus[0] = kInvSqrt2;    plus[1] = i * kInvSqrt2;
            minus[0] = kInvSqrt2;   minus[1] = -i * kInvSqrt2;
            break;
    }
}

} // namespace

int Register::append(Party party, Role role, std::string name, int partner_id) {
    if (size() + 1 > kMaxQubits) {
        throw ResourceError("register capacity exceeded (" + std::to_string(kMaxQubits) + " qubits)");
    }
    int id = next_id_++;
    slots_.push_back({id, party, role, std::move(name), partner_id});
    return id;
}

void Register::set_partner(int id, int partner_id) {
    slots_[position_of(id)].partner_id = partner_id;
}

void Register::remove(int id) {
    int pos = position_of(id);
    slots_.erase(slots_.begin() + pos);
}

bool Register::contains(int id) const {
    return std::any_of(slots_.begin(), slots_.end(),
                       [id](const RegisterSlot& s) { return s.id == id; });
}

int Register::position_of(int id) const {
    for (int p = 0; p < size(); ++p) {
        if (slots_[p].id == id) return p;
    }
    throw StructuralError("qubit id " + std::to_string(id) + " not in register");
}

const RegisterSlot& Register::slot(int id) const {
    return slots_[position_of(id)];
}

QubitRef Register::ref(int id) const {
    const RegisterSlot& s = slot(id);
    return {s.id, s.party, s.role};
}

bool Register::operator==(const Register& o) const {
    if (slots_.size() != o.slots_.size()) return false;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const RegisterSlot& a = slots_[i];
        const RegisterSlot& b = o.slots_[i];
        if (a.id != b.id || a.party != b.party || a.role != b.role) return false;
    }
    return true;
}

StateVector::StateVector(Register reg, std::vector<Complex> amps)
    : reg_(std::move(reg)), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << reg_.size())) {
        throw StructuralError("amplitude count must be 2^k");
    }
}

StateVector StateVector::computational(Register reg, const std::string& label) {
    if (static_cast<int>(label.size()) != reg.size()) {
        throw StructuralError("basis label length does not match register size");
    }
    std::size_t idx = 0;
    int k = reg.size();
    for (int p = 0; p < k; ++p) {
        char c = label[p];
        if (c != '0' && c != '1') throw StructuralError("basis label must be a bitstring");
        if (c == '1') idx |= std::size_t{1} << (k - 1 - p);
    }
    std::vector<Complex> amps(std::size_t{1} << k, Complex{0.0, 0.0});
    amps[idx] = Complex{1.0, 0.0};
    return StateVector(std::move(reg), std::move(amps));
}

double StateVector::squared_norm() const {
    double n = 0.0;
    for (const Complex& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::check_norm() const {
    if (std::abs(squared_norm() - 1.0) > 1e-12) {
        throw ValidationError("state norm drifted beyond 1e-12");
    }
}

StateVector StateVector::apply(const Gate& g) const {
    if (!is_unitary(g.matrix)) {
        throw ValidationError("gate '" + g.name + "' is not unitary within 1e-12");
    }
    const int t = g.arity();
    std::vector<int> pos(t);
    for (int j = 0; j < t; ++j) {
        pos[j] = reg_.position_of(g.targets[j]);
        for (int l = 0; l < j; ++l) {
            if (g.targets[l] == g.targets[j]) {
                throw StructuralError("duplicate gate targets");
            }
        }
    }
    const int k = reg_.size();
    std::vector<std::size_t> bit(t);
    std::size_t targets_mask = 0;
    for (int j = 0; j < t; ++j) {
        bit[j] = std::size_t{1} << (k - 1 - pos[j]); // first target = MSB of local index
        targets_mask |= bit[j];
    }

    StateVector out(*this);
    const std::size_t n = amps_.size();
    const std::size_t sub = std::size_t{1} << t;
    std::vector<Complex> in_block(sub), out_block(sub);
    for (std::size_t base = 0; base < n; ++base) {
        if (base & targets_mask) continue;
        for (std::size_t lp = 0; lp < sub; ++lp) {
            std::size_t idx = base;
            for (int j = 0; j < t; ++j) {
                if (lp & (std::size_t{1} << (t - 1 - j))) idx |= bit[j];
            }
            in_block[lp] = amps_[idx];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t c = 0; c < sub; ++c) acc += g.matrix(r, c) * in_block[c];
            out_block[r] = acc;
        }
        for (std::size_t lp = 0; lp < sub; ++lp) {
            std::size_t idx = base;
            for (int j = 0; j < t; ++j) {
                if (lp & (std::size_t{1} << (t - 1 - j))) idx |= bit[j];
            }
            out.amps_[idx] = out_block[lp];
        }
    }
    out.check_norm();
    return out;
}

std::vector<MeasurementBranch> StateVector::measure(PauliAxis axis, int qubit_id) const {
    const int pos = reg_.position_of(qubit_id);
    const int k = reg_.size();
    const std::size_t bit = std::size_t{1} << (k - 1 - pos);

    Complex evec[2][2];
    axis_eigenvectors(axis, evec[0], evec[1]);

    std::vector<MeasurementBranch> out;
    for (int b = 0; b < 2; ++b) {
        const Complex* e = evec[b];
        std::vector<Complex> post(amps_.size(), Complex{0.0, 0.0});
        double p = 0.0;
        for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
            if (idx & bit) continue;
            // overlap of the (a0, a1) pair with the eigenvector
            Complex c = std::conj(e[0]) * amps_[idx] + std::conj(e[1]) * amps_[idx | bit];
            p += std::norm(c);
            post[idx] = e[0] * c;
            post[idx | bit] = e[1] * c;
        }
        if (p < kBranchPruneThreshold) continue;
        double inv = 1.0 / std::sqrt(p);
        for (Complex& a : post) a *= inv;
        out.push_back({b == 0 ? +1 : -1, p, StateVector(reg_, std::move(post))});
    }
    return out;
}

std::optional<std::pair<double, StateVector>>
StateVector::collapse_remove(PauliAxis axis, int qubit_id, int outcome) const {
    const int pos = reg_.position_of(qubit_id);
    const int k = reg_.size();
    const std::size_t bit = std::size_t{1} << (k - 1 - pos);

    Complex evec[2][2];
    axis_eigenvectors(axis, evec[0], evec[1]);
    const Complex* e = evec[outcome == +1 ? 0 : 1];

    const std::size_t low_mask = bit - 1;
    std::vector<Complex> post(amps_.size() / 2, Complex{0.0, 0.0});
    double p = 0.0;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (idx & bit) continue;
        Complex c = std::conj(e[0]) * amps_[idx] + std::conj(e[1]) * amps_[idx | bit];
        p += std::norm(c);
        std::size_t packed = ((idx & ~low_mask) >> 1) | (idx & low_mask);
        post[packed] = c;
    }
    if (p < kBranchPruneThreshold) return std::nullopt;
    double inv = 1.0 / std::sqrt(p);
    for (Complex& a : post) a *= inv;

    Register reduced = reg_;
    reduced.remove(qubit_id);
    return std::make_pair(p, StateVector(std::move(reduced), std::move(post)));
}

StateVector StateVector::remove_product_qubit(int qubit_id) const {
    DensityMatrix rho = reduced({qubit_id});
    if (std::abs(rho.purity() - 1.0) > 1e-9) {
        throw ProtocolError("qubit " + std::to_string(qubit_id) +
                            " is still entangled; cannot discard");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
    long imax;
    es.eigenvalues().maxCoeff(&imax);
    Eigen::VectorXcd v = es.eigenvectors().col(imax);

    const int pos = reg_.position_of(qubit_id);
    const int k = reg_.size();
    const std::size_t bit = std::size_t{1} << (k - 1 - pos);
    const std::size_t low_mask = bit - 1;

    std::vector<Complex> post(amps_.size() / 2, Complex{0.0, 0.0});
    double p = 0.0;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (idx & bit) continue;
        Complex c = std::conj(v(0)) * amps_[idx] + std::conj(v(1)) * amps_[idx | bit];
        p += std::norm(c);
        std::size_t packed = ((idx & ~low_mask) >> 1) | (idx & low_mask);
        post[packed] = c;
    }
    double inv = 1.0 / std::sqrt(p);
    for (Complex& a : post) a *= inv;

    Register reduced_reg = reg_;
    reduced_reg.remove(qubit_id);
    return StateVector(std::move(reduced_reg), std::move(post));
}

StateVector StateVector::append_ebit(int& a_id_out, int& b_id_out, const std::string& tag) const {
    if (reg_.size() + 2 > kMaxQubits) {
        throw ResourceError("register capacity exceeded while preparing an ebit");
    }
    Register reg = reg_;
    int a_id = reg.append(Party::Alice, Role::EbitHalf, "a" + tag);
    int b_id = reg.append(Party::Bob, Role::EbitHalf, "b" + tag, a_id);
    reg.set_partner(a_id, b_id);
    std::vector<Complex> amps(amps_.size() * 4, Complex{0.0, 0.0});
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        amps[idx * 4 + 0] = amps_[idx] * kInvSqrt2; // |0_a 0_b>
        amps[idx * 4 + 3] = amps_[idx] * kInvSqrt2; // |1_a 1_b>
    }
    StateVector out(std::move(reg), std::move(amps));
    a_id_out = a_id;
    b_id_out = b_id;
    return out;
}

DensityMatrix StateVector::reduced(const std::vector<int>& keep_ids) const {
    if (keep_ids.empty()) throw StructuralError("partial trace requires a non-empty keep set");
    const int k = reg_.size();
    const int m = static_cast<int>(keep_ids.size());
    std::vector<std::size_t> keep_bit(m);
    std::size_t keep_mask = 0;
    for (int j = 0; j < m; ++j) {
        keep_bit[j] = std::size_t{1} << (k - 1 - reg_.position_of(keep_ids[j]));
        if (keep_mask & keep_bit[j]) throw StructuralError("duplicate qubits in keep set");
        keep_mask |= keep_bit[j];
    }

    const std::size_t dim = std::size_t{1} << m;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    const std::size_t n = amps_.size();

    auto kept_index = [&](std::size_t idx) {
        std::size_t r = 0;
        for (int j = 0; j < m; ++j) {
            if (idx & keep_bit[j]) r |= std::size_t{1} << (m - 1 - j);
        }
        return r;
    };

    // rho[r,c] = sum over traced-out configurations of psi psi^*
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (std::norm(amps_[idx]) == 0.0) continue;
        std::size_t r = kept_index(idx);
        std::size_t rest = idx & ~keep_mask;
        for (std::size_t idx2 = 0; idx2 < n; ++idx2) {
            if ((idx2 & ~keep_mask) != rest) continue;
            rho(r, kept_index(idx2)) += amps_[idx] * std::conj(amps_[idx2]);
        }
    }
    return DensityMatrix(std::move(rho));
}

Complex StateVector::inner(const StateVector& other) const {
    if (!(reg_ == other.reg_)) throw StructuralError("inner product requires identical registers");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

double StateVector::overlap(const StateVector& other) const {
    return std::abs(inner(other));
}

StateVector make_state(const Register& reg, const std::string& label) {
    return StateVector::computational(reg, label);
}

StateVector apply_gate(const StateVector& s, const Gate& g) {
    return s.apply(g);
}

std::vector<MeasurementBranch> measure_branches(const StateVector& s, PauliAxis axis, int qubit_id) {
    return s.measure(axis, qubit_id);
}

DensityMatrix partial_trace(const StateVector& s, const std::vector<int>& keep_ids) {
    return s.reduced(keep_ids);
}

Complex inner_product(const StateVector& x, const StateVector& y) {
    return x.inner(y);
}

Register two_party_register() {
    Register reg;
    reg.append(Party::Alice, Role::System, "A");
    reg.append(Party::Bob, Role::System, "B");
    return reg;
}

Register four_level_pair_register() {
    Register reg;
    reg.append(Party::Alice, Role::System, "A1");
    reg.append(Party::Alice, Role::System, "A2");
    reg.append(Party::Bob, Role::System, "B1");
    reg.append(Party::Bob, Role::System, "B2");
    return reg;
}

} // namespace nlm
