from mittagmat.cli import main

raise SystemExit(main())
