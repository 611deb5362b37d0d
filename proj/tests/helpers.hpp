#pragma once

#include <memory>
#include <string>

#include "dplab/config.hpp"

namespace dplab::testing {

// Concave-convex reference problem (unit interval, ambient dimension 4,
// p = 2, q = 2.4, a = 1, critical pair, pure concave power reaction).
inline std::unique_ptr<Lab> cc_lab(int nodes = 65) {
  const std::string text =
      "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = " + std::to_string(nodes) +
      "\nambient_n = 4\n"
      "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
      "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
      "[kirchhoff]\nkind = constant\nm0 = 1.0\ntau0 = 1.0\n"
      "[reaction]\nfamily = concave_convex\nentry = power\n"
      "coef1 = 1.0\ncoef2 = 0.0\ndelta = const 1.5\n"
      "ball_center = 0.5\nball_radius = 0.25\n";
  return build_lab(parse_config_text(text));
}

inline std::unique_ptr<Lab> sl_lab(int nodes = 65) {
  const std::string text =
      "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = " + std::to_string(nodes) +
      "\nambient_n = 4\n"
      "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
      "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
      "[reaction]\nfamily = superlinear\nentry = power\n"
      "coef1 = 1.0\ncoef2 = 1.0\ndelta = const 2.7\n"
      "ball_center = 0.5\nball_radius = 0.25\n";
  return build_lab(parse_config_text(text));
}

inline std::unique_ptr<Lab> ccp_lab(int nodes = 33) {
  const std::string text =
      "[mesh]\nbox_min = 0 0\nbox_max = 1 1\nnodes = " + std::to_string(nodes) +
      " " + std::to_string(nodes) +
      "\nambient_n = 2\n"
      "[fields]\np = const 1.5\nq = const 1.8\na = const 0.0\n"
      "c1 = const 1.0\nc2 = const 0.0\nr1 = pstar\n"
      "[reaction]\nfamily = concave_convex\nentry = power\n"
      "coef1 = 1.0\ncoef2 = 0.0\ndelta = const 1.3\n"
      "ball_center = 0.5 0.5\nball_radius = 0.25\n";
  return build_lab(parse_config_text(text));
}

}  // namespace dplab::testing
