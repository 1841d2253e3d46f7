#ifndef LTK_TESTS_GEN_HPP
#define LTK_TESTS_GEN_HPP

#include "ltk/oracle.hpp"

namespace ltk::test {

using ltk::random_formula;
using ltk::random_rule;

}  // namespace ltk::test

#endif
