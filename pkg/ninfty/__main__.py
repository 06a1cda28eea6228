import sys

from ninfty.main import main

sys.exit(main())
