#pragma once

#include "iontrap/errors.hpp"
#include "iontrap/fock.hpp"
#include "iontrap/hamiltonian.hpp"
#include "iontrap/state.hpp"
#include "iontrap/closed_form.hpp"
#include "iontrap/timescales.hpp"
#include "iontrap/oracle.hpp"
#include "iontrap/scenario.hpp"
