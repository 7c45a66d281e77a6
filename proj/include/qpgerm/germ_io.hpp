#pragma once

// Germ file format: a JSON document
//
//   {
//     "n": 2,
//     "order_cap": 8,
//     "lambda_angles": ["0.3819660112501051", "0.6180339887498949"],
//     "alpha": [1, 1],
//     "components": {
//       "z1": [{"re": 1, "im": 0, "z_exp": 1, "w_exp": [0, 0]}, ...],
//       "w1": [...],
//       "w2": [...]
//     }
//   }
//
// Angles are in turns (lambda_j = exp(2 pi i theta_j)). The linear part must
// be listed explicitly and is checked against lambda_angles.

#include <filesystem>
#include <string>
#include <vector>

#include "qpgerm/germ.hpp"

namespace qpgerm {

struct GermFile {
    GermMap germ;
    std::vector<int> alpha;
};

// Parse/validation failure with a field path or line:column location.
class InputError : public Error {
public:
    using Error::Error;
};

GermFile parse_germ(const std::string& text, const SpectrumLimits& limits = {});
GermFile read_germ_file(const std::filesystem::path& path, const SpectrumLimits& limits = {});

std::string to_json(const GermFile& file);
void write_germ_file(const std::filesystem::path& path, const GermFile& file);

// 64-bit FNV-1a, printed as 16 hex digits
std::string fnv1a_hex(const std::string& bytes);

// Reference germs with golden-pair spectrum theta = ((3 - sqrt 5)/2, 1 - (3 - sqrt 5)/2)
// and alpha = (1, 1):
//   E1: z1 = z - z^2,  w_j1 = lambda_j w_j - (lambda_j/2) (w_1 w_2) w_j
//   E2: as E1 with the resonant term multiplied by z
//   E3: as E1 with (w_1 w_2)^2 in place of (w_1 w_2)
enum class ReferenceGerm { E1, E2, E3 };

std::vector<double> golden_pair_angles();
GermFile make_reference_germ(ReferenceGerm which, int order_cap = 8);
ReferenceGerm parse_reference_name(const std::string& name);

} // namespace qpgerm
