#!/usr/bin/env python3
# This file is a part of ncdim and is subject to the the terms of the MIT license.
# See https://github.com/ncdim/ncdim/blob/main/LICENSE.txt for the full license text.
# SPDX-License-Identifier: MIT

from ncdim.main import main

if __name__ == '__main__':
    main()
