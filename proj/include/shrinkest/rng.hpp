#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string_view>

namespace shrinkest {

/// Identifies the generator and normal transform; bumped whenever either changes.
inline constexpr std::string_view kGeneratorVersion = "mt19937_64-polar-v1";

/// Independent, reproducible stream keyed by (master seed, stream index).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which are
/// bit-exact by the standard. Normals use the Marsaglia polar method on 53-bit
/// uniforms, so the output does not depend on the standard library's distributions.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    Eigen::VectorXd normal_vector(Eigen::Index size);
    Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace shrinkest
