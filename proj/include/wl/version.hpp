#pragma once

#define WLEXIT_VERSION "0.1.0"
