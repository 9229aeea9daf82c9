#ifndef HCF_VERSION_HPP
#define HCF_VERSION_HPP

namespace hcf {

inline constexpr const char* library_version = "0.1.0";

// Identifies the sum/inner-product conventions baked into this build.
// Reports embed it so downstream consumers can detect convention changes.
//   pairs-v1: tensor inner products and curvature sums run over unordered
//   index pairs i<j; K = (1/2) sum_p v_p v_p^H.
inline constexpr const char* convention_version = "hcf-pairs-v1";

}  // namespace hcf

#endif
