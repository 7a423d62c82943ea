#pragma once

#include "cheb/braids.hpp"

namespace cheb::testing {

using cheb::braid;
using cheb::crossing;
using cheb::random_homotopy;
using cheb::random_word;

}  // namespace cheb::testing
