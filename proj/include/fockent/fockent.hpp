#pragma once

#include "fockent/error.hpp"
#include "fockent/first_quant.hpp"
#include "fockent/fock_state.hpp"
#include "fockent/linalg.hpp"
#include "fockent/measures.hpp"
#include "fockent/rdm.hpp"
#include "fockent/spinmap.hpp"
#include "fockent/transform.hpp"
#include "fockent/yang.hpp"
