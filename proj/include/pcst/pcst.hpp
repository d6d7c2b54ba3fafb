#pragma once

#include "pcst/certify.hpp"
#include "pcst/instance.hpp"
#include "pcst/iterate.hpp"
#include "pcst/moat.hpp"
#include "pcst/rational.hpp"
#include "pcst/steiner.hpp"
#include "pcst/stp.hpp"
